public class Main {
    public static void main(String[] args) {
        Runnable r = () -> { class Local {} };
    }
}
